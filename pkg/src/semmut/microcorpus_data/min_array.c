int min_array(int *data, int count) {
    int lowest = data[0];
    int i;
    for (i = 1; i < count; i++) {
        if (data[i] < lowest) {
            lowest = data[i];
        }
    }
    return lowest;
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
