#pragma once

namespace ahgr::cli {

/// Entry point for the ahgr command-line tool. Exit codes: 0 success,
/// 1 usage error, 2 data/format error, 3 numerical failure.
int run(int argc, const char* const* argv);

} // namespace ahgr::cli
