#include <iostream>
#include <string>
#include <vector>

#include "etk/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return etk::parse_and_dispatch(args, std::cout, std::cerr);
}
