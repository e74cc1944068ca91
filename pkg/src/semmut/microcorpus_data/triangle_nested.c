int triangle_nested(int n) {
    int cells = 0;
    int row;
    int col;
    for (row = 0; row < n && row < 20; row++) {
        for (col = 0; col <= row; col++) {
            cells += 1;
        }
    }
    return cells;
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
