#include <algorithm>
#include <cstdlib>
#include <future>
#include <string>

#include "dmlab/error.hpp"
#include "dmlab/kernels/leaf_histogram.hpp"

namespace dmlab::kernels {

namespace {

std::optional<Isa> g_override;

void check_schedule(const LeafSchedule& schedule, std::uint64_t begin, std::uint64_t end) {
  require(schedule.leaf_depth >= 0 && schedule.leaf_depth <= 32, ErrorCode::DepthLimit,
          "leaf enumeration supports depth <= 32");
  const std::uint64_t leaves = std::uint64_t{1} << schedule.leaf_depth;
  require(begin <= end && end <= leaves, ErrorCode::InvalidParameter, "leaf range outside the level");
  const std::uint64_t width_mask = leaves - 1;
  for (auto m : schedule.stage_masks)
    require(m != 0 && (m & ~width_mask) == 0, ErrorCode::InvalidParameter, "stage mask outside the leaf bits");
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(DMLAB_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detected_isa() { return supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() {
  if (g_override) return *g_override;
  if (const char* env = std::getenv("DMLAB_SIMD")) {
    std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && supported(Isa::Avx2)) return Isa::Avx2;
  }
  return detected_isa();
}

void set_isa_override(std::optional<Isa> isa) {
  require(!isa || supported(*isa), ErrorCode::InvalidParameter, "requested SIMD variant not supported here");
  g_override = isa;
}

void leaf_histogram(Isa isa, const LeafSchedule& schedule, std::uint64_t begin, std::uint64_t end,
                    std::span<std::uint64_t> counts) {
  check_schedule(schedule, begin, end);
  require(counts.size() == schedule.rows() * schedule.cols(), ErrorCode::InvalidParameter, "histogram size mismatch");
#if defined(DMLAB_HAVE_AVX2_KERNELS)
  if (isa == Isa::Avx2) {
    require(supported(Isa::Avx2), ErrorCode::InvalidParameter, "AVX2 not available");
    leaf_histogram_avx2(schedule, begin, end, counts);
    return;
  }
#else
  require(isa == Isa::Scalar, ErrorCode::InvalidParameter, "AVX2 kernels not built");
#endif
  leaf_histogram_scalar(schedule, begin, end, counts);
}

std::vector<std::uint64_t> leaf_histogram(const LeafSchedule& schedule, std::uint64_t begin, std::uint64_t end,
                                          unsigned workers) {
  check_schedule(schedule, begin, end);
  const Isa isa = active_isa();
  const std::size_t cells = schedule.rows() * schedule.cols();
  workers = std::max(1u, workers);
  const std::uint64_t span_len = end - begin;
  std::vector<std::future<std::vector<std::uint64_t>>> parts;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t b = begin + span_len * w / workers;
    std::uint64_t e = begin + span_len * (w + 1) / workers;
    parts.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, [=, &schedule] {
      std::vector<std::uint64_t> local(cells, 0);
      leaf_histogram(isa, schedule, b, e, local);
      return local;
    }));
  }
  std::vector<std::uint64_t> total(cells, 0);
  for (auto& p : parts) {
    auto local = p.get();
    for (std::size_t c = 0; c < cells; ++c) total[c] += local[c];
  }
  return total;
}

}  // namespace dmlab::kernels
