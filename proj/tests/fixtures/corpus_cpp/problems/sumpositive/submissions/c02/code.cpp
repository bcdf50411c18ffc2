#include <vector>

// submission c02: sums everything and drops semicolons
int sumPositive(const std::vector<int>& values) {
    int total = 0
    for (int v : values) {
        total += v
    }
    return total;
}
