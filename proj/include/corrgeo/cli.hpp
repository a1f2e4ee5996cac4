#pragma once

namespace corrgeo {

/// Full command-line entry point. Returns 0 on success, 1 on a validation
/// or usage error, 2 on a numerical failure.
int cli_main(int argc, const char* const* argv);

}  // namespace corrgeo
