int asm_marker(int n) {
    int total = 0;
    int i;
    __asm__("");
    for (i = 0; i < n; i++) {
        total += 2;
    }
    return total;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {0, 1, 2, 3, 5, 8, 13, 21};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
