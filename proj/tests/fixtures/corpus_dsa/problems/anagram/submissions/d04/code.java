// submission d04 (Solution 2)
public class Anagram {
    public static boolean isAnagram(String s1, String s2) {
        int[] a = new int[26];
        int[] b = new int[26];
        // counting loops were not finished
        return java.util.Arrays.equals(a, b);
    }
}
