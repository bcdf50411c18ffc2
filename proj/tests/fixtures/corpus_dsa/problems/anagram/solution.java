public class Anagram {
    public static boolean isAnagram(String s1, String s2) {
        int[] charCount = new int[26];
        for (int i = 0; i < s1.length(); i++) charCount[s1.charAt(i) - 'a']++;
        for (int i = 0; i < s2.length(); i++) charCount[s2.charAt(i) - 'a']--;
        for (int c : charCount) if (c != 0) return false;
        return true;
    }
}
