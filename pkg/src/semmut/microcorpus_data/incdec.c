int incdec(int n) {
    int i = n;
    int j = n;
    int k = 0;
    i++;
    j--;
    ++k;
    --i;
    return i * 100 + j * 10 + k;
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
