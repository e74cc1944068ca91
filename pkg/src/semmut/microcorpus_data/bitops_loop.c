int bitops_loop(int x) {
    int bits = 0;
    int i;
    for (i = 0; i < 16; i++) {
        if ((x >> i) & 1) {
            bits++;
        }
    }
    return bits;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {0, 1, 2, 3, 7, 255, 1024, 65535};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
