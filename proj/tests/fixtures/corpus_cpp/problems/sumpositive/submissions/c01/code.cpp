#include <vector>

// submission c01
int sumPositive(const std::vector<int>& values) {
    int total = 0;
    for (int v : values) {
        if (v > 0) total += v;
    }
    return total;
}
