#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <memory>
#include <mutex>
#include <vector>

#include "hjac/blocked.hpp"
#include "hjac/config.hpp"
#include "hjac/core.hpp"

namespace hjac {

// Raised in workers blocked on a channel when another worker has failed.
class ChannelAborted : public Error {
 public:
  ChannelAborted() : Error("channel aborted") {}
};

// Unbounded FIFO with blocking, time-limited receive.
template <typename M>
class Channel {
 public:
  void send(M message) {
    {
      std::lock_guard lock(mutex_);
      if (aborted_) {
        throw ChannelAborted();
      }
      queue_.push_back(std::move(message));
    }
    ready_.notify_one();
  }

  M receive(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    if (!ready_.wait_for(lock, timeout,
                         [&] { return aborted_ || !queue_.empty(); })) {
      throw NumericalError("receive timed out");
    }
    if (aborted_) {
      throw ChannelAborted();
    }
    M message = std::move(queue_.front());
    queue_.pop_front();
    return message;
  }

  void abort() {
    {
      std::lock_guard lock(mutex_);
      aborted_ = true;
    }
    ready_.notify_all();
  }

  std::size_t pending() const {
    std::lock_guard lock(mutex_);
    return queue_.size();
  }

 private:
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<M> queue_;
  bool aborted_ = false;
};

// A block-column in transit with its share of J and of the diagonal cache.
template <Scalar T>
struct BlockMessage {
  std::size_t block = 0;  // 1-based
  DenseMatrix<T> cols;
  std::vector<int> signs;
  std::vector<double> d;
};

struct Tally {
  std::size_t rotations = 0;
  std::size_t big_rotations = 0;
  bool broadcast = false;  // second phase of the all-reduce
};

// Inboxes of the p workers.
template <Scalar T>
class Ring {
 public:
  Ring(std::size_t p, std::chrono::milliseconds timeout);

  std::size_t size() const { return blocks_.size(); }
  std::chrono::milliseconds timeout() const { return timeout_; }

  void send_block(std::size_t to, BlockMessage<T> message);
  BlockMessage<T> receive_block(std::size_t rank);
  void send_tally(std::size_t to, Tally t);
  Tally receive_tally(std::size_t rank);

  void abort();
  std::size_t block_messages() const { return block_messages_.load(); }

 private:
  std::vector<std::unique_ptr<Channel<BlockMessage<T>>>> blocks_;
  std::vector<std::unique_ptr<Channel<Tally>>> tallies_;
  std::atomic<std::size_t> block_messages_{0};
  std::chrono::milliseconds timeout_;
};

// Ring all-reduce: partial sums travel 0 -> 1 -> ... -> p-1, then the
// total travels p-1 -> 0 -> ... -> p-2. Every worker must call it.
template <Scalar T>
Tally exchange_convergence(const Tally& local, std::size_t rank, Ring<T>& ring);

struct ParallelStats {
  int sweeps = 0;
  std::size_t rotations = 0;
  bool converged = false;
  std::size_t block_messages = 0;
};

// Orthogonalizes the columns of g in place on a ring of config.p workers.
// The outer partition is uniform with 2p blocks, so n >= 2p is required.
// Errors raised by a worker are rethrown with its rank in the message.
template <Scalar T>
ParallelStats parallel_orthogonalize(DenseMatrix<T>& g, const SignVector& j,
                                     const SolverConfig& config);

// parallel_orthogonalize followed by eigenpair extraction.
template <Scalar T>
EigenResult<T> parallel_jacobi(DenseMatrix<T> g, const SignVector& j,
                               const SolverConfig& config);

}  // namespace hjac
