// Stand-alone certificate checker: reads only the two files it is given.
#include <fstream>
#include <iostream>
#include <sstream>

#include "itbound/verify.hpp"

namespace {

bool slurp(const char* path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream s;
  s << in.rdbuf();
  out = s.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: itbound-verify <certificate> <problem-file>\n";
    return 2;
  }
  std::string cert, problem;
  if (!slurp(argv[1], cert) || !slurp(argv[2], problem)) {
    std::cerr << "cannot read input files\n";
    return 2;
  }
  const auto report = itbound::verify_certificate(cert, problem);
  if (!report.ok) {
    std::cout << "REJECTED: " << report.diagnostic << "\n";
    return 1;
  }
  std::cout << "VERIFIED alpha + " << report.eta.get_str() << "*beta >= " << report.bound.get_str() << "\n";
  return 0;
}
