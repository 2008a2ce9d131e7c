#include "sorlayout/server.hpp"

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <optional>
#include <thread>
#include <vector>

#include "sorlayout/error.hpp"

namespace sorlayout {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

http::status status_for(const json& response) {
  if (response.value("type", "") != "error") return http::status::ok;
  const std::string code = response.value("code", "");
  if (code == to_string(ErrorCode::kUnknownSession)) return http::status::not_found;
  if (code == to_string(ErrorCode::kLimitExceeded)) return http::status::too_many_requests;
  return http::status::bad_request;
}

json error_json(ErrorCode code, const std::string& message) {
  return {{"type", "error"}, {"code", std::string(to_string(code))}, {"message", message}};
}

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, SolverService& service)
      : ws_(std::move(socket)), service_(service) {}

  void start(http::request<http::string_body> request) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    // The worker owns a reference until the queue is closed and drained.
    std::thread([self = shared_from_this()] { self->work(); }).detach();
    read();
  }

  void read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      queue_.close();
      return;
    }
    json message = json::parse(beast::buffers_to_string(buffer_.data()), nullptr, false);
    buffer_.consume(buffer_.size());
    if (message.is_discarded()) {
      send(error_json(ErrorCode::kBadRequest, "malformed JSON").dump());
    } else {
      queue_.push(std::move(message));
    }
    read();
  }

  void work() {
    while (auto message = queue_.pop()) {
      std::string text = service_.handle(*message).dump();
      net::post(ws_.get_executor(), [self = shared_from_this(), text = std::move(text)]() mutable {
        self->send(std::move(text));
      });
    }
  }

  // Runs on the strand.
  void send(std::string text) {
    outbox_.push_back(std::move(text));
    if (outbox_.size() == 1) write();
  }

  void write() {
    ws_.text(true);
    ws_.async_write(net::buffer(outbox_.front()),
                    beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      queue_.close();
      return;
    }
    outbox_.pop_front();
    if (!outbox_.empty()) write();
  }

  websocket::stream<beast::tcp_stream> ws_;
  SolverService& service_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  MessageQueue queue_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, SolverService& service)
      : stream_(std::move(socket)), service_(service) {}

  void start() {
    net::dispatch(stream_.get_executor(),
                  beast::bind_front_handler(&HttpSession::read, shared_from_this()));
  }

 private:
  void read() {
    request_ = {};
    stream_.expires_after(std::chrono::seconds(60));
    http::async_read(stream_, buffer_, request_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (websocket::is_upgrade(request_)) {
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), service_)->start(std::move(request_));
      return;
    }
    respond();
  }

  void respond() {
    json body;
    std::optional<http::status> status;
    const std::string target(request_.target());
    if (request_.method() != http::verb::post) {
      body = error_json(ErrorCode::kBadRequest, "only POST is supported");
    } else if (target != "/load" && target != "/resize" && target != "/mutate" &&
               target != "/stats") {
      body = error_json(ErrorCode::kBadRequest, "unknown endpoint '" + target + "'");
      status = http::status::not_found;
    } else {
      json message = json::parse(request_.body(), nullptr, false);
      if (message.is_discarded() || !message.is_object()) {
        body = error_json(ErrorCode::kBadRequest, "body must be a JSON object");
      } else {
        message["type"] = target.substr(1);
        body = service_.handle(message);
      }
    }

    auto response = std::make_shared<http::response<http::string_body>>(status.value_or(status_for(body)),
                                                                         request_.version());
    response->set(http::field::content_type, "application/json");
    response->keep_alive(request_.keep_alive());
    response->body() = body.dump();
    response->prepare_payload();
    http::async_write(stream_, *response,
                      [self = shared_from_this(), response](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        if (!response->keep_alive()) {
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
                          return;
                        }
                        self->read();
                      });
  }

  beast::tcp_stream stream_;
  SolverService& service_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
};

}  // namespace

struct Server::Impl {
  Impl(SolverService& s, int n) : service(s), ioc(n), acceptor(net::make_strand(ioc)), threads(n) {}

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec == net::error::operation_aborted) return;
      } else {
        std::make_shared<HttpSession>(std::move(socket), service)->start();
      }
      accept();
    });
  }

  SolverService& service;
  net::io_context ioc;
  tcp::acceptor acceptor;
  int threads;
};

Server::Server(SolverService& service, const std::string& address, unsigned short port,
               int threads)
    : impl_(std::make_unique<Impl>(service, std::max(1, threads))) {
  beast::error_code ec;
  const tcp::endpoint endpoint{net::ip::make_address(address, ec), port};
  if (ec) throw Error(ErrorCode::kInvalidArgument, "bad listen address '" + address + "'");
  auto& acceptor = impl_->acceptor;
  acceptor.open(endpoint.protocol(), ec);
  if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acceptor.bind(endpoint, ec);
  if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot listen on " + address + ": " + ec.message());
  impl_->accept();
}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
  std::vector<std::thread> pool;
  for (int i = 1; i < impl_->threads; ++i) pool.emplace_back([this] { impl_->ioc.run(); });
  impl_->ioc.run();
  for (auto& t : pool) t.join();
}

void Server::stop() { impl_->ioc.stop(); }

}  // namespace sorlayout
