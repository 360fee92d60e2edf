#include "groundroll/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
  return grl::cli::run(argc, argv, std::cout, std::cerr);
}
