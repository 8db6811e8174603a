#ifndef FRANSON_CLI_HPP
#define FRANSON_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace franson
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1; // compare failed, undefined visibility
inline constexpr int kExitUsage = 2;   // bad flags, bad config, I/O errors

// Entry point of the `franson` tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace franson

#endif
