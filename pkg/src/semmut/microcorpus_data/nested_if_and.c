int nested_if_and(int a, int b) {
    int flags = 0;
    if (a > 0 && b > 0) {
        flags = 1;
    }
    if (a % 2 == 0 && b % 2 == 0 && a != b) {
        flags += 2;
    }
    return flags;
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
