int strlen_local(int pad) {
    char text[16] = "metamorphic";
    int len = 0;
    while (text[len] != 0) {
        len++;
    }
    return len + pad;
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
