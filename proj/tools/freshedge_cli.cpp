#include <cstdio>
int main() { std::puts("freshedge cli placeholder"); return 0; }
