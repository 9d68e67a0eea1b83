#include "tricons/cli.hpp"

int main(int argc, char** argv) {
    return tricons::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
