#pragma once

#include <memory>

#include <spdlog/logger.h>

namespace pbs {

// Library-wide logger ("pbs"), writing to stderr at warn level by default.
std::shared_ptr<spdlog::logger> logger();

// Replaces the logger's sinks; used by the CLI for verbosity and by tests to
// capture log lines.
void set_log_sink(spdlog::sink_ptr sink, spdlog::level::level_enum level);

}  // namespace pbs
