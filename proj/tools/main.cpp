#include <string>
#include <vector>

#include "hdfts/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hdfts::cli::run(args);
}
