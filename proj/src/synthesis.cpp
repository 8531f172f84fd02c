#include "wn2declare/synthesis.hpp"

#include "wn2declare/fsa.hpp"

namespace wnd {

DeclareSpec synthesize(const WorkflowNet& net) {
  const NetIndex idx = build_index(net);
  DeclareSpec spec;
  spec.alphabet = net.transitions;
  spec.constraints.reserve(net.places.size());
  for (const std::string& p : net.places) {
    const std::vector<std::string>& pre = idx.pre.at(p);
    const std::vector<std::string>& post = idx.post.at(p);
    if (!pre.empty() && !post.empty()) {
      spec.constraints.push_back(alternate_precedence(pre, post));
    } else if (pre.empty()) {
      spec.constraints.push_back(at_most_one(post));
    } else {
      spec.constraints.push_back(end(pre));
    }
  }
  return spec;
}

VerifyResult verify_equivalence(const WorkflowNet& net, std::size_t max_states) {
  StateSpace ss = explore(net, max_states);
  DeclareSpec spec = synthesize(net);
  Fsa sf = spec_fsa_bounded(spec, max_states);
  EquivResult eq = equivalent(ss.fsa, sf);
  VerifyResult out;
  out.equivalent = eq.equivalent;
  out.witness = eq.witness;
  out.reachability_states = ss.fsa.num_states();
  out.specification_states = sf.num_states();
  return out;
}

}  // namespace wnd
