int ptr_sum(int *values, int count) {
    int total = 0;
    int *p = values;
    while (p < values + count) {
        total += *p;
        p++;
    }
    return total;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int data[8] = {3, -1, 4, 1, -5, 9, 2, 6};
    int k;
    for (k = 1; k <= 8; k++)
        printf("%d\n", FUT(data, k));
    return 0;
}
