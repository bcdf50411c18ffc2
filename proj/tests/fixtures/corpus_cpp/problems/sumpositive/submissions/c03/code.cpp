// submission c03: never finished
int sumPositive(values) {
    int total = ;
    for v in values { total += v }
}
