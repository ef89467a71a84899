#pragma once

namespace skycast {

// Full command-line entry point. Returns the process exit code:
// 0 success, 1 usage or internal error, 2 data error, 3 training divergence.
int cli_main(int argc, char** argv);

} // namespace skycast
