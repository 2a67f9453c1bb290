#ifndef IONPULSE_CLI_HPP
#define IONPULSE_CLI_HPP

namespace ionpulse {

// Command-line front end; returns the process exit status:
// 0 success, 1 usage error, 2 infeasible optimization, 3 numerical failure.
int run_cli(int argc, const char* const* argv);

} // namespace ionpulse

#endif
