#include <iostream>

#include "cavityent/app.hpp"

int main(int argc, char** argv) {
    return cavityent::app::cli_main(argc, argv, std::cout, std::cerr);
}
