#include <benchmark/benchmark.h>

#include <random>

#include "stdpg/model.hpp"
#include "stdpg/synth.hpp"

namespace {

stdpg::SynthResult make_instance(std::uint32_t n, std::uint32_t m_star) {
  stdpg::SynthSpec spec;
  spec.m_star = m_star;
  spec.n = n;
  spec.concentration = 4.0;
  spec.seed = 1;
  spec.domain = stdpg::Domain{0.0, 1.0, 0.0, 1.0};
  spec.theta = stdpg::RangeParams{0.03, 0.1, {}};
  return stdpg::simulate(spec);
}

stdpg::StickState uniform_sticks(std::size_t m) {
  stdpg::StickState stick;
  stick.sticks.assign(m, 0.2);
  stick.sticks[m - 1] = 1.0;
  stick.weights = stdpg::stick_weights(stick.sticks);
  stick.concentration = 4.0;
  return stick;
}

void BM_LogKernel(benchmark::State& state) {
  const auto truth = make_instance(256, 4);
  const stdpg::RangeParams theta{0.03, 0.1, {}};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        stdpg::log_kernel(truth.data, i, truth.centers, i % 4, theta));
    i = (i + 1) % truth.data.size();
  }
}
BENCHMARK(BM_LogKernel);

void BM_MembershipProbs(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  auto truth = make_instance(512, 4);
  stdpg::ClusterCenters centers = truth.centers;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  while (centers.size() < m) {
    centers.spatial.push_back({u01(rng), u01(rng)});
    centers.time.push_back(u01(rng));
  }
  const auto stick = uniform_sticks(m);
  const stdpg::RangeParams theta{0.03, 0.1, {}};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        stdpg::membership_probs(truth.data, i, centers, stick, theta));
    i = (i + 1) % truth.data.size();
  }
}
BENCHMARK(BM_MembershipProbs)->Arg(40)->Arg(120)->Arg(200);

void BM_LogLikelihood(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto truth = make_instance(n, 8);
  const auto stick = uniform_sticks(8);
  const stdpg::RangeParams theta{0.03, 0.1, {}};
  std::vector<std::uint32_t> nonempty;
  for (std::uint32_t j = 0; j < 8; ++j) nonempty.push_back(j);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        stdpg::log_likelihood(truth.data, truth.centers, stick, theta, nonempty));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_LogLikelihood)->Arg(1000)->Arg(4000);

}  // namespace
