#include <cstdio>

int main() {
  std::puts("acceptance: criteria not implemented yet");
  return 1;
}
