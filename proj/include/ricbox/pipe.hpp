#pragma once

#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ricbox/errors.hpp"

namespace ricbox {

// Single-producer/single-consumer blocking pipe carrying encoded messages;
// one message in flight per direction per slot.
class MessagePipe {
public:
    void send(std::vector<std::uint8_t> bytes) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [this] { return !slot_.has_value(); });
        slot_ = std::move(bytes);
        not_empty_.notify_one();
    }

    std::vector<std::uint8_t> receive() {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [this] { return slot_.has_value(); });
        std::vector<std::uint8_t> out = std::move(*slot_);
        slot_.reset();
        not_full_.notify_one();
        return out;
    }

    bool has_message() const {
        std::unique_lock lock(mutex_);
        return slot_.has_value();
    }

private:
    mutable std::mutex mutex_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
    std::optional<std::vector<std::uint8_t>> slot_;
};

// In-process stand-in for the E2 setup handshake: nodes register once,
// then exchange indications and controls over the paired pipes.
class E2Session {
public:
    void register_node(std::uint16_t node_id) {
        std::unique_lock lock(mutex_);
        if (!nodes_.insert(node_id).second)
            throw contract_error("e2 session: node " + std::to_string(node_id) +
                                 " already registered");
    }

    bool registered(std::uint16_t node_id) const {
        std::unique_lock lock(mutex_);
        return nodes_.count(node_id) > 0;
    }

    void send_indication(std::uint16_t node_id, std::vector<std::uint8_t> bytes) {
        require_registered(node_id);
        indications_.send(std::move(bytes));
    }

    std::vector<std::uint8_t> receive_indication() { return indications_.receive(); }

    void send_control(std::uint16_t node_id, std::vector<std::uint8_t> bytes) {
        require_registered(node_id);
        controls_.send(std::move(bytes));
    }

    std::vector<std::uint8_t> receive_control() { return controls_.receive(); }

private:
    void require_registered(std::uint16_t node_id) const {
        if (!registered(node_id))
            throw contract_error("e2 session: node " + std::to_string(node_id) +
                                 " not registered");
    }

    mutable std::mutex mutex_;
    std::set<std::uint16_t> nodes_;
    MessagePipe indications_;
    MessagePipe controls_;
};

} // namespace ricbox
