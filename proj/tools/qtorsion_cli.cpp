#include <iostream>

#include <qtorsion/cli.hpp>

int main(int argc, char** argv)
{
    return qtorsion::cli::run(argc, argv, std::cout, std::cerr);
}
