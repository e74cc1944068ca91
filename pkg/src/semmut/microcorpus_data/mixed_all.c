int mixed_all(int n, int step) {
    int lo = 0, hi = 100;
    int cursor = n;
    int rounds = 0;
    for (rounds = 0; rounds < 6; rounds++) {
        cursor = cursor > hi ? hi : cursor;
        cursor = cursor < lo ? lo : cursor;
        if (cursor % 2 == 0 && step > 0) {
            cursor += step;
        } else {
            cursor -= 1;
        }
    }
    return cursor;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[][2] = {{-7, 3}, {0, 0}, {4, -4}, {9, 2}, {-1, -1}, {6, 10}, {15, 4}, {100, 37}};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k][0], inputs[k][1]));
    return 0;
}
