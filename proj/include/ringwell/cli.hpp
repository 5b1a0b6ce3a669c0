#ifndef RINGWELL_CLI_HPP
#define RINGWELL_CLI_HPP

namespace ringwell {

/// Full command-line front end. Exit codes: 0 success, 1 criterion failure,
/// 2 config error, 3 regime violation / infeasible schedule.
int run_cli(int argc, const char* const* argv);

} // namespace ringwell

#endif
