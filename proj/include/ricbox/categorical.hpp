#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "ricbox/errors.hpp"
#include "ricbox/rng.hpp"

namespace ricbox {

// Max-subtracted softmax; safe for logit magnitudes well beyond 1e3.
inline std::vector<double> softmax(const std::vector<double>& logits) {
    if (logits.empty()) throw contract_error("softmax: empty logits");
    const double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

inline double log_sum_exp(const std::vector<double>& logits) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double v : logits) sum += std::exp(v - mx);
    return mx + std::log(sum);
}

// (log pi(action | logits), Shannon entropy of the distribution).
inline std::pair<double, double> log_prob_and_entropy(const std::vector<double>& logits,
                                                      int action) {
    if (action < 0 || static_cast<std::size_t>(action) >= logits.size())
        throw contract_error("log_prob_and_entropy: action out of range");
    const double lse = log_sum_exp(logits);
    const double log_prob = logits[static_cast<std::size_t>(action)] - lse;
    // H = lse - sum_i p_i * logit_i
    double dot = 0.0;
    const std::vector<double> p = softmax(logits);
    for (std::size_t i = 0; i < logits.size(); ++i) dot += p[i] * logits[i];
    return {log_prob, lse - dot};
}

// Samples from the softmax distribution; returns (action, log pi(action)).
inline std::pair<int, double> softmax_sample(const std::vector<double>& logits, Rng& rng) {
    const std::vector<double> p = softmax(logits);
    const double u = rng.uniform();
    double cum = 0.0;
    int action = static_cast<int>(p.size()) - 1; // fp-rounding fallback
    for (std::size_t i = 0; i < p.size(); ++i) {
        cum += p[i];
        if (u < cum) {
            action = static_cast<int>(i);
            break;
        }
    }
    return {action, log_prob_and_entropy(logits, action).first};
}

// argmax with deterministic tie-break to the lowest index.
inline int greedy_action(const std::vector<double>& logits) {
    if (logits.empty()) throw contract_error("greedy_action: empty logits");
    std::size_t best = 0;
    for (std::size_t i = 1; i < logits.size(); ++i)
        if (logits[i] > logits[best]) best = i;
    return static_cast<int>(best);
}

} // namespace ricbox
