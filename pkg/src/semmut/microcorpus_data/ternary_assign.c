int ternary_assign(int a, int b) {
    int big;
    int small;
    big = a > b ? a : b;
    small = a > b ? b : a;
    return big * 10 + small;
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
