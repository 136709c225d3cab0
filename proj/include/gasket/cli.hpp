#pragma once

namespace gasket {

/// Command-line front end. Exit codes: 0 success, 2 configuration error
/// (bad flags, invalid laws, missing arguments), 3 runtime error.
int cli_main(int argc, const char* const* argv);

}  // namespace gasket
