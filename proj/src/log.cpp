#include "pbs/log.hpp"

#include <mutex>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace pbs {

namespace {

std::mutex& logger_mutex() {
    static std::mutex m;
    return m;
}

std::shared_ptr<spdlog::logger>& instance() {
    static std::shared_ptr<spdlog::logger> log = [] {
        auto l = std::make_shared<spdlog::logger>("pbs", std::make_shared<spdlog::sinks::stderr_sink_mt>());
        l->set_level(spdlog::level::warn);
        return l;
    }();
    return log;
}

}  // namespace

std::shared_ptr<spdlog::logger> logger() {
    std::lock_guard lock(logger_mutex());
    return instance();
}

void set_log_sink(spdlog::sink_ptr sink, spdlog::level::level_enum level) {
    std::lock_guard lock(logger_mutex());
    auto l = std::make_shared<spdlog::logger>("pbs", std::move(sink));
    l->set_level(level);
    instance() = std::move(l);
}

}  // namespace pbs
