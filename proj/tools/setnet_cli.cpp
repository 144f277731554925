#include <cstdio>

int main() {
  std::puts("setnet: command line interface under construction");
  return 1;
}
