#pragma once

namespace swingctl {

inline constexpr const char* kVersion = "1.0.0";

/// Entry point of swingctl; returns the process exit status
/// (0 ok, 1 config, 2 data, 3 numerical).
int run(int argc, char** argv);

} // namespace swingctl
