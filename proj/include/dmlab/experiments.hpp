#pragma once

#include <string>
#include <vector>

#include "dmlab/io.hpp"

namespace dmlab::experiments {

enum class Status { Pass, Fail, Inconclusive };

struct RunOptions {
  bool timing = false;  // adds wall time; reports are then no longer byte-stable
  unsigned workers = 0; // 0: hardware concurrency
};

const std::vector<std::string>& example_names();

// Overrides are a flat JSON object of experiment parameters; unknown keys are rejected.
io::Json run_example(const std::string& name, const io::Json& overrides = io::Json::object(),
                     const RunOptions& options = {});

Status report_status(const io::Json& report);
int exit_code(Status s);
std::string to_string(Status s);

}  // namespace dmlab::experiments
