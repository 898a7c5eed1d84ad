#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return qkdlab::cli::main({argv + 1, argv + argc}, std::cout, std::cerr);
}
