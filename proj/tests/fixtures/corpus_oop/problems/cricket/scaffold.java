import java.util.*;
import java.io.*;

public class CricketDataHandler {
    // TODO: implement readPlayersFromFile below.
    public static List<Player> readPlayersFromFile(String fileName) {
        // write your code here
        return null;
    }
}
