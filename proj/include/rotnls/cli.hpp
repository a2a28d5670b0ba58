#pragma once

namespace rotnls {

/// Exit codes: 0 pass or completed, 1 error, 2 verdict failure (or an
/// unresolved simulation), 3 blow-up detected by `simulate`.
int cli_main(int argc, char** argv);

}  // namespace rotnls
