#include <exception>
#include <iostream>

#include "conesmooth/cli.hpp"

int main(int argc, char** argv) {
    try {
        return conesmooth::cli::run(argc, argv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return conesmooth::cli::kExitUsage;
    }
}
