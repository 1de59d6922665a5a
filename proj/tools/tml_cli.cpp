#include <iostream>

#include "tml/report.hpp"

int main(int argc, char** argv) { return tml::run_command_line(argc, argv, std::cout, std::cerr); }
