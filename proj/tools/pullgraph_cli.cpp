#include <iostream>
#include <string>
#include <vector>

#include "pullgraph/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pullgraph::run_cli(args, std::cout, std::cerr);
}
