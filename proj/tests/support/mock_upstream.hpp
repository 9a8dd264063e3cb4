#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace pbs::testing {

// Canned chat-completions endpoint on an ephemeral localhost port.
class MockUpstream {
public:
    struct Reply {
        int status = 200;
        std::string body;
        std::chrono::milliseconds delay{0};
    };

    explicit MockUpstream(std::function<Reply(const httplib::Request&)> handler) : handler_(std::move(handler)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            {
                std::lock_guard lock(mutex_);
                last_authorization_ = req.get_header_value("Authorization");
                last_body_ = req.body;
            }
            const Reply r = handler_(req);
            if (r.delay.count() > 0) std::this_thread::sleep_for(r.delay);
            res.status = r.status;
            res.set_content(r.body, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockUpstream() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }
    int requests() const { return requests_; }
    std::string last_authorization() const {
        std::lock_guard lock(mutex_);
        return last_authorization_;
    }
    std::string last_body() const {
        std::lock_guard lock(mutex_);
        return last_body_;
    }

private:
    std::function<Reply(const httplib::Request&)> handler_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> requests_{0};
    mutable std::mutex mutex_;
    std::string last_authorization_;
    std::string last_body_;
};

// Wraps a document the way chat-completions endpoints return it.
inline std::string chat_envelope(const std::string& content) {
    nlohmann::json doc;
    doc["id"] = "cmpl-test";
    doc["object"] = "chat.completion";
    doc["choices"] = nlohmann::json::array({{{"index", 0},
                                             {"message", {{"role", "assistant"}, {"content", content}}},
                                             {"finish_reason", "stop"}}});
    return doc.dump();
}

}  // namespace pbs::testing
