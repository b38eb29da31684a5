#include <cstdio>
int main() { std::puts("elx placeholder"); return 0; }
