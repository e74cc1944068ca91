int reverse_array(int *data, int count) {
    int buf[8];
    int i;
    int checksum = 0;
    for (i = 0; i < count && i < 8; i++) {
        buf[count - 1 - i] = data[i];
    }
    for (i = 0; i < count && i < 8; i++) {
        checksum = checksum * 31 + buf[i];
    }
    return checksum;
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
