#pragma once

namespace stcf {

/// Entry point of the stcf command-line tool. Returns 0 on success, 2 on
/// invalid input or usage, 1 on solver failure.
int run_cli(int argc, char** argv);

}  // namespace stcf
