// SPDX-License-Identifier: Apache-2.0
#include "adspec/cli.hpp"

int main(int argc, char **argv) { return adspec::run_cli(argc, argv); }
