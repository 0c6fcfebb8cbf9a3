#pragma once

#include <iosfwd>

namespace iidseval::cli {

enum ExitCode : int { ok = 0, findings = 1, usage = 2, runtime = 3 };

/// Entry point behind the `iidseval` binary. Data goes to `out`,
/// diagnostics to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iidseval::cli
