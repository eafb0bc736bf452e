// quic3-smt: SMT-LIB2 solver for ground quantifier-free LIA + arrays.
// Reads commands from stdin (or a file argument), answers on stdout.

#include <fstream>
#include <iostream>

#include "quic3/smt/server.hpp"

int main(int argc, char **argv) {
  std::ios::sync_with_stdio(false);
  if (argc > 1) {
    std::ifstream f(argv[1]);
    if (!f) {
      std::cerr << "quic3-smt: cannot open " << argv[1] << "\n";
      return 2;
    }
    quic3::smt::Server server(f, std::cout);
    return server.run();
  }
  quic3::smt::Server server(std::cin, std::cout);
  return server.run();
}
