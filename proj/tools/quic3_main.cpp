// quic3: safety model checker for transition systems over LIA + arrays.

#include <iostream>

int main() {
  std::cerr << "quic3: frontend not wired yet\n";
  return 2;
}
