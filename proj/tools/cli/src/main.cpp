#include "opuc_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return opuc::cli::run(argc, argv, std::cout, std::cerr);
}
