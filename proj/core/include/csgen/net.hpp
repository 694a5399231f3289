#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>

#include "csgen/error.hpp"

namespace csgen::net {

/// All attempts at an HTTP request failed (connection refused, timeout,
/// non-2xx status). attempts is the number of tries actually made.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts)
      : Error(what), attempts(attempts) {}
  int attempts;
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds backoff_base{1000};  // doubles after each failure
};

/// Bounds concurrent requests against one endpoint and spaces request starts
/// so at most `per_second` begin per second. Zero or negative disables the
/// corresponding limit.
class RequestGate {
 public:
  RequestGate(int max_in_flight, double per_second);

  void acquire();
  void release();

 private:
  using Clock = std::chrono::steady_clock;

  int max_in_flight_;
  std::chrono::nanoseconds interval_;
  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  Clock::time_point next_start_{};
};

/// RAII slot in a RequestGate.
class GateLease {
 public:
  explicit GateLease(RequestGate& gate) : gate_(&gate) { gate_->acquire(); }
  ~GateLease() {
    if (gate_) gate_->release();
  }
  GateLease(const GateLease&) = delete;
  GateLease& operator=(const GateLease&) = delete;

 private:
  RequestGate* gate_;
};

struct HttpOptions {
  RetryPolicy retry;
  int timeout_ms = 30000;
  int max_in_flight = 4;
  double requests_per_second = 0.0;  // 0 = unlimited
  std::string api_key_env;           // env var holding a bearer token; "" = none
};

struct PostResult {
  std::string body;  // response body of the successful attempt
  int attempts;      // 1-based attempt number that succeeded
};

/// JSON-over-HTTP client for one endpoint URL. Thread-safe; requests pass
/// through a per-endpoint RequestGate and transient failures are retried with
/// exponential backoff.
class HttpClient {
 public:
  HttpClient(std::string url, HttpOptions options);
  ~HttpClient();
  HttpClient(const HttpClient&) = delete;
  HttpClient& operator=(const HttpClient&) = delete;

  /// POSTs `body` as application/json. Throws TransportError after the last
  /// failed attempt.
  PostResult post_json(const std::string& body);

  const std::string& url() const { return url_; }

 private:
  struct Impl;
  std::string url_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace csgen::net
