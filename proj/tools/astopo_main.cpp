#include <iostream>
#include <string>
#include <vector>

#include "astopo/cli.hpp"

int main(int argc, char** argv) {
    unsigned threads = 0;
    if (!astopo::cli::threads_from_env(threads)) {
        std::cerr << "astopo: ASTOPO_THREADS must be a non-negative integer\n";
        return astopo::cli::kUsageError;
    }
    std::vector<std::string> args(argv + 1, argv + argc);
    return astopo::cli::run(args, std::cout, std::cerr, threads);
}
