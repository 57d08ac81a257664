#include "izone/pipeline.hpp"

namespace izone {

PipelineResult run_pipeline(NetworkCase net, int r, double tau,
                            std::uint64_t seed, int max_iter) {
  PipelineResult p;
  p.net = std::move(net);
  p.pl = build_laplacian(p.net);
  p.rd = kron_reduce(p.pl, p.net.generators, p.net.nominal_freq);
  p.es = eigensystem(p.rd);
  p.dnw = extend_dnw(merw_dnw(p.rd), p.pl);
  p.fm = build_features(p.es, p.pl, p.dnw, r);
  const KInit init = auto_k_init(p.fm, tau, seed);
  p.zr = system_sep_and_sed(weighted_kmeans(p.fm, init, p.dnw, max_iter), p.dnw);
  return p;
}

}  // namespace izone
