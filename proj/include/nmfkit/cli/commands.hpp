#pragma once

#include "nmfkit/cli/manifest.hpp"

namespace nmfkit::cli {

// Each command writes its report (and timing sidecar) into out_dir and
// returns a process exit status: 0 iff every requested run completed.
int cmd_factorize(const RunManifest& m);
int cmd_pipeline(const RunManifest& m);
int cmd_compare(const RunManifest& m);
int cmd_consistency(const RunManifest& m);
int cmd_sweep(const RunManifest& m);
int cmd_export_fixture(const RunManifest& m);

}  // namespace nmfkit::cli
