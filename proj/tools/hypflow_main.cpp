#include <iostream>

#include "hypflow/runner.hpp"

int main(int argc, char** argv) {
    try {
        return hypflow::cliMain(argc, argv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
