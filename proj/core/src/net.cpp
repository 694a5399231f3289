#include "csgen/net.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace csgen::net {

RequestGate::RequestGate(int max_in_flight, double per_second)
    : max_in_flight_(max_in_flight),
      interval_(per_second > 0.0 ? std::chrono::nanoseconds(static_cast<long long>(1e9 / per_second))
                                 : std::chrono::nanoseconds::zero()) {}

void RequestGate::acquire() {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return max_in_flight_ <= 0 || in_flight_ < max_in_flight_; });
  ++in_flight_;
  if (interval_.count() == 0) return;
  // Space out request starts; sleep outside the lock so other threads can
  // queue up behind later slots meanwhile.
  auto now = Clock::now();
  auto slot = std::max(now, next_start_);
  next_start_ = slot + interval_;
  lock.unlock();
  if (slot > now) std::this_thread::sleep_until(slot);
}

void RequestGate::release() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

namespace {

// "http://host:port/some/path" -> {"http://host:port", "/some/path"}
struct SplitUrl {
  std::string origin;
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error("endpoint URL missing scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

struct HttpClient::Impl {
  SplitUrl target;
  HttpOptions options;
  std::string api_key;
  RequestGate gate;

  Impl(SplitUrl target, HttpOptions opts)
      : target(std::move(target)),
        options(opts),
        gate(opts.max_in_flight, opts.requests_per_second) {
    if (!options.api_key_env.empty()) {
      if (const char* value = std::getenv(options.api_key_env.c_str())) api_key = value;
    }
  }
};

HttpClient::HttpClient(std::string url, HttpOptions options)
    : url_(std::move(url)), impl_(std::make_unique<Impl>(split_url(url_), options)) {}

HttpClient::~HttpClient() = default;

PostResult HttpClient::post_json(const std::string& body) {
  const HttpOptions& opt = impl_->options;
  const int max_attempts = std::max(1, opt.retry.attempts);
  std::string last_error;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) {
      auto delay = opt.retry.backoff_base * (1LL << (attempt - 2));
      spdlog::warn("retrying POST {} (attempt {}/{}) after {}: {}", url_, attempt, max_attempts,
                   delay.count() ? std::to_string(delay.count()) + "ms" : "0ms", last_error);
      std::this_thread::sleep_for(delay);
    }
    GateLease lease(impl_->gate);
    // A fresh connection per attempt keeps this object safe under concurrent
    // callers without serializing them on a shared socket.
    httplib::Client client(impl_->target.origin);
    const time_t sec = opt.timeout_ms / 1000;
    const time_t usec = static_cast<time_t>(opt.timeout_ms % 1000) * 1000;
    client.set_connection_timeout(sec, usec);
    client.set_read_timeout(sec, usec);
    client.set_write_timeout(sec, usec);
    httplib::Headers headers;
    if (!impl_->api_key.empty()) headers.emplace("Authorization", "Bearer " + impl_->api_key);
    auto res = client.Post(impl_->target.path, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    return {res->body, attempt};
  }
  throw TransportError("POST " + url_ + " failed after " + std::to_string(max_attempts) +
                           " attempts: " + last_error,
                       max_attempts);
}

}  // namespace csgen::net
