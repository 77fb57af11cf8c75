#include "hjac/parallel.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "hjac/schedule.hpp"

namespace hjac {

template <Scalar T>
Ring<T>::Ring(std::size_t p, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  if (p == 0) {
    throw InputError("ring needs at least one worker");
  }
  for (std::size_t q = 0; q < p; ++q) {
    blocks_.push_back(std::make_unique<Channel<BlockMessage<T>>>());
    tallies_.push_back(std::make_unique<Channel<Tally>>());
  }
}

template <Scalar T>
void Ring<T>::send_block(std::size_t to, BlockMessage<T> message) {
  blocks_.at(to)->send(std::move(message));
  ++block_messages_;
}

template <Scalar T>
BlockMessage<T> Ring<T>::receive_block(std::size_t rank) {
  return blocks_.at(rank)->receive(timeout_);
}

template <Scalar T>
void Ring<T>::send_tally(std::size_t to, Tally t) {
  tallies_.at(to)->send(t);
}

template <Scalar T>
Tally Ring<T>::receive_tally(std::size_t rank) {
  return tallies_.at(rank)->receive(timeout_);
}

template <Scalar T>
void Ring<T>::abort() {
  for (auto& c : blocks_) {
    c->abort();
  }
  for (auto& c : tallies_) {
    c->abort();
  }
}

template <Scalar T>
Tally exchange_convergence(const Tally& local, std::size_t rank, Ring<T>& ring) {
  const std::size_t p = ring.size();
  if (p == 1) {
    return local;
  }
  Tally acc = local;
  acc.broadcast = false;
  if (rank > 0) {
    const Tally partial = ring.receive_tally(rank);
    if (partial.broadcast) {
      throw NumericalError("convergence exchange out of order");
    }
    acc.rotations += partial.rotations;
    acc.big_rotations += partial.big_rotations;
  }
  if (rank + 1 < p) {
    ring.send_tally(rank + 1, acc);
    Tally total = ring.receive_tally(rank);
    if (!total.broadcast) {
      throw NumericalError("convergence exchange out of order");
    }
    if (rank + 2 < p) {
      ring.send_tally(rank + 1, total);
    }
    total.broadcast = false;
    return total;
  }
  // Last rank holds the total and starts the broadcast.
  Tally total = acc;
  total.broadcast = true;
  ring.send_tally(0, total);
  total.broadcast = false;
  return total;
}

namespace {

bool is_full(Variant v) { return v == Variant::p2F || v == Variant::p3F; }
bool is_three_level(Variant v) {
  return v == Variant::p3F || v == Variant::p3B;
}

template <Scalar T>
class Worker {
 public:
  Worker(std::size_t rank, const SolverConfig& config, Ring<T>& ring,
         BlockMessage<T> first, BlockMessage<T> second)
      : rank_(rank),
        p_(config.p),
        config_(config),
        ring_(ring),
        state_(init_strategy(rank, 2 * config.p)) {
    slots_[0] = std::move(first);
    slots_[1] = std::move(second);
  }

  // Runs until global convergence or the sweep limit.
  ParallelStats run() {
    ParallelStats stats;
    const std::size_t steps = steps_per_sweep(config_.strategy, p_);
    for (int sweep = 1; sweep <= config_.tol.max_sweeps; ++sweep) {
      Tally local;
      for (std::size_t k = 0; k < steps; ++k) {
        local.rotations += compute_step(k == 0, local);
        exchange();
      }
      const Tally global = exchange_convergence(local, rank_, ring_);
      ++state_.nsweep;
      stats.sweeps = sweep;
      stats.rotations += global.rotations;
      if (global.rotations == 0) {
        stats.converged = true;
        break;
      }
    }
    return stats;
  }

  BlockMessage<T>& slot(std::size_t k) { return slots_[k]; }

 private:
  // Local block step on [G_i, G_j]; returns the number of rotations.
  std::size_t compute_step(bool first_step, Tally& tally) {
    BlockMessage<T>& a = slots_[0];
    BlockMessage<T>& b = slots_[1];
    const std::size_t ni = a.cols.cols();
    const std::size_t nj = b.cols.cols();
    const std::size_t np = ni + nj;
    const SignVector jp = SignVector::concat(SignVector(a.signs), SignVector(b.signs));
    const Variant v = config_.variant;

    DenseMatrix<T> r = local_factor(first_step || !is_full(v));
    DenseMatrix<T> w(np, np);
    MatrixView<T> wv = w.view();
    const Tolerances& tol = config_.tol;
    const bool three = is_three_level(v) && np >= 2 * config_.inner_nt;

    std::size_t rotations = 0;
    std::size_t big = 0;
    if (is_full(v)) {
      if (three) {
        const BlockPartition inner =
            uniform_partition(np, num_blocks(np, config_.inner_nt));
        const RunStats rs = full_block(r.view(), jp, inner, tol, &wv);
        rotations = rs.rotations;
        big = rs.last_sweep.big_rotations;
      } else {
        std::vector<double> d;
        const RunStats rs =
            jacobi_diagonalize(r.view(), jp, d, &wv, tol, tol.max_sweeps);
        rotations = rs.rotations;
        big = rs.last_sweep.big_rotations;
      }
    } else if (first_step) {
      if (three) {
        const BlockPartition inner = BlockPartition::concat(
            uniform_partition(ni, num_blocks(ni, config_.inner_nt)),
            uniform_partition(nj, num_blocks(nj, config_.inner_nt)));
        Tolerances once = tol;
        once.max_sweeps = 1;
        const RunStats rs = block_oriented(r.view(), jp, inner, once, &wv);
        rotations = rs.rotations;
        big = rs.last_sweep.big_rotations;
      } else {
        std::vector<double> d;
        const RunStats rs = jacobi_diagonalize(r.view(), jp, d, &wv, tol, 1);
        rotations = rs.rotations;
        big = rs.last_sweep.big_rotations;
      }
    } else {
      w.eigen().setIdentity();
      SweepStats s;
      if (three) {
        s = off_diagonal_pass(r.view(), jp, ni, config_.inner_nt, tol, &wv);
      } else {
        std::vector<double> d = column_norms_squared(r);
        s = jacobi_cycle(r.view(), jp, std::span<double>(d), &wv, ni, nj,
                         false, tol);
      }
      rotations = s.rotations_applied;
      big = s.big_rotations;
    }
    tally.big_rotations += big;

    if (rotations > 0) {
      if (ws_.capacity() < a.cols.rows() * np) {
        ws_ = Workspace<T>(a.cols.rows(), std::max(ni, nj));
      }
      update_block_columns(a.cols.view(), b.cols.view(), ConstMatrixView<T>(w.view()), ws_);
    }
    const std::vector<double> norms = column_norms_squared(r);
    a.d.assign(norms.begin(), norms.begin() + static_cast<std::ptrdiff_t>(ni));
    b.d.assign(norms.begin() + static_cast<std::ptrdiff_t>(ni), norms.end());
    return rotations;
  }

  // Cholesky factor of the local pivot; the structured form needs both
  // diagonal blocks already diagonal with D cached.
  DenseMatrix<T> local_factor(bool dense) {
    const BlockMessage<T>& a = slots_[0];
    const BlockMessage<T>& b = slots_[1];
    if (!dense) {
      try {
        const DenseMatrix<T> a_ij = gram(a.cols, b.cols);
        return structured_cholesky<T>(a.d, a_ij.view(), b.d);
      } catch (const NumericalError&) {
        // Fall through to the dense factorization.
      }
    }
    try {
      return cholesky_upper(pair_gram(a.cols.view(), b.cols.view()));
    } catch (const NumericalError&) {
      throw NumericalError("block pivot (" + std::to_string(a.block) + ", " +
                           std::to_string(b.block) +
                           ") is numerically indefinite");
    }
  }

  void exchange() {
    const StepPlan plan = strategy_step(config_.strategy, state_, p_);
    const std::size_t out = slots_[0].block == plan.snd_blk ? 0 : 1;
    if (slots_[out].block != plan.snd_blk) {
      throw NumericalError("schedule asks to send block " +
                           std::to_string(plan.snd_blk) + " which is not held");
    }
    ring_.send_block(plan.snd_rnk, std::move(slots_[out]));
    BlockMessage<T> in = ring_.receive_block(rank_);
    if (in.block != plan.rcv_blk) {
      throw NumericalError("expected block " + std::to_string(plan.rcv_blk) +
                           ", received block " + std::to_string(in.block));
    }
    slots_[out] = std::move(in);
    if (slots_[0].block > slots_[1].block) {
      std::swap(slots_[0], slots_[1]);
    }
  }

  std::size_t rank_;
  std::size_t p_;
  const SolverConfig& config_;
  Ring<T>& ring_;
  StrategyState state_;
  BlockMessage<T> slots_[2];
  Workspace<T> ws_;
};

template <Scalar T>
BlockMessage<T> make_message(const DenseMatrix<T>& g, const SignVector& j,
                             const BlockPartition& part, std::size_t block) {
  BlockMessage<T> msg;
  msg.block = block;
  const std::size_t off = part.offset(block - 1);
  const std::size_t cnt = part.size(block - 1);
  msg.cols = copy_of(g.columns(off, cnt));
  const SignVector seg = j.segment(off, cnt);
  msg.signs.assign(seg.begin(), seg.end());
  return msg;
}

}  // namespace

template <Scalar T>
ParallelStats parallel_orthogonalize(DenseMatrix<T>& g, const SignVector& j,
                                     const SolverConfig& config) {
  config.validate();
  if (!is_parallel(config.variant)) {
    throw InputError("parallel_orthogonalize: variant " +
                     to_string(config.variant) + " is sequential");
  }
  const std::size_t p = config.p;
  const std::size_t n = g.cols();
  if (j.size() != n) {
    throw InputError("sign vector length does not match the factor");
  }
  if (n < 2 * p) {
    throw InputError("need at least 2p = " + std::to_string(2 * p) +
                     " columns, the factor has " + std::to_string(n));
  }
  config.tol.validate();
  const BlockPartition part = uniform_partition(n, 2 * p);

  Ring<T> ring(p, config.recv_timeout);
  std::vector<std::unique_ptr<Worker<T>>> workers;
  for (std::size_t q = 0; q < p; ++q) {
    workers.push_back(std::make_unique<Worker<T>>(
        q, config, ring, make_message(g, j, part, q + 1),
        make_message(g, j, part, 2 * p - q)));
  }

  std::vector<ParallelStats> results(p);
  std::vector<std::exception_ptr> errors(p);
  std::vector<bool> aborted(p, false);
  auto body = [&](std::size_t q) {
    try {
      results[q] = workers[q]->run();
    } catch (const ChannelAborted&) {
      aborted[q] = true;
    } catch (...) {
      errors[q] = std::current_exception();
      ring.abort();
    }
  };
  if (p == 1) {
    body(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t q = 0; q < p; ++q) {
      threads.emplace_back(body, q);
    }
    for (auto& t : threads) {
      t.join();
    }
  }
  for (std::size_t q = 0; q < p; ++q) {
    if (!errors[q]) {
      continue;
    }
    const std::string where = "worker " + std::to_string(q) + ": ";
    try {
      std::rethrow_exception(errors[q]);
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError(where + e.what());
    } catch (const std::exception& e) {
      throw NumericalError(where + e.what());
    }
  }
  if (std::find(aborted.begin(), aborted.end(), true) != aborted.end()) {
    throw NumericalError("worker ring aborted without a reported cause");
  }

  // Put the blocks back in their original order.
  ColumnTracker tracker(2 * p);
  for (std::size_t q = 0; q < p; ++q) {
    tracker.assign(2 * q, workers[q]->slot(0).block);
    tracker.assign(2 * q + 1, workers[q]->slot(1).block);
  }
  const std::vector<std::size_t> order = tracker.restore_order();
  for (std::size_t b = 0; b < 2 * p; ++b) {
    const std::size_t slot = order[b];
    const BlockMessage<T>& msg = workers[slot / 2]->slot(slot % 2);
    if (msg.cols.cols() != part.size(b)) {
      throw NumericalError("block " + std::to_string(b + 1) +
                           " returned with the wrong width");
    }
    const auto src = msg.cols.storage();
    std::copy(src.begin(), src.end(), g.col(part.offset(b)).begin());
  }

  ParallelStats stats = results[0];
  stats.block_messages = ring.block_messages();
  return stats;
}

template <Scalar T>
EigenResult<T> parallel_jacobi(DenseMatrix<T> g, const SignVector& j,
                               const SolverConfig& config) {
  const ParallelStats stats = parallel_orthogonalize(g, j, config);
  std::vector<std::size_t> perm(g.cols());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  EigenResult<T> out = extract_eigen(ConstMatrixView<T>(g.view()), j, perm);
  out.sweeps = stats.sweeps;
  out.rotations = stats.rotations;
  out.converged = stats.converged;
  return out;
}

template class Ring<double>;
template class Ring<complex128>;
template Tally exchange_convergence(const Tally&, std::size_t, Ring<double>&);
template Tally exchange_convergence(const Tally&, std::size_t, Ring<complex128>&);
template ParallelStats parallel_orthogonalize(DenseMatrix<double>&,
                                              const SignVector&,
                                              const SolverConfig&);
template ParallelStats parallel_orthogonalize(DenseMatrix<complex128>&,
                                              const SignVector&,
                                              const SolverConfig&);
template EigenResult<double> parallel_jacobi(DenseMatrix<double>,
                                             const SignVector&,
                                             const SolverConfig&);
template EigenResult<complex128> parallel_jacobi(DenseMatrix<complex128>,
                                                 const SignVector&,
                                                 const SolverConfig&);

}  // namespace hjac
