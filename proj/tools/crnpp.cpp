#include <string>
#include <vector>

#include "crnpp/cli.hpp"

int main(int argc, char** argv) {
    return crnpp::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
