// povgrid/replay.hpp - experience replay: fixed-capacity ring buffer with
// uniform without-replacement batch sampling.
#pragma once

#include <cstddef>
#include <vector>

#include "povgrid/errors.hpp"
#include "povgrid/qnet.hpp"
#include "povgrid/rng.hpp"
#include "povgrid/world.hpp"

namespace povgrid {

struct Transition {
    AgentInput state;
    Action action = Action::Up;
    double reward = 0.0;
    AgentInput next_state;                  // ignored in the TD target when terminal
    std::vector<Action> next_admissible;
    bool terminal = false;
};

class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 50000) : capacity_(capacity) {
        if (capacity_ == 0) throw DomainError("replay: capacity must be positive");
    }

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return store_.size(); }

    // FIFO eviction once full.
    void push(Transition t) {
        if (store_.size() < capacity_) {
            store_.push_back(std::move(t));
        } else {
            store_[head_] = std::move(t);
            head_ = (head_ + 1) % capacity_;
        }
    }

    // Uniform sample of `batch` distinct transitions.
    std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const {
        if (batch > store_.size()) throw DomainError("replay: batch larger than buffer");
        std::vector<std::size_t> picked;
        picked.reserve(batch);
        while (picked.size() < batch) {
            const std::size_t idx = rng.uniform_int(store_.size());
            bool seen = false;
            for (std::size_t p : picked)
                if (p == idx) {
                    seen = true;
                    break;
                }
            if (!seen) picked.push_back(idx);
        }
        std::vector<const Transition*> out;
        out.reserve(batch);
        for (std::size_t p : picked) out.push_back(&store_[p]);
        return out;
    }

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // next eviction slot once full
    std::vector<Transition> store_;
};

}  // namespace povgrid
