#pragma once

#include <string>

#include "wn2declare/net.hpp"

namespace wnd {

struct PnmlError : NetError {
  using NetError::NetError;
};

// Accepts the place/transition subset: a single <net>, optional <page>
// wrappers, <place>, <transition>, and <arc> elements addressed by id.
// Transition <name> text is retained as a display name; initial markings and
// graphics are ignored.  Arc inscriptions other than 1, arc types other than
// "normal", duplicate ids, and structurally broken nets are all rejected.
WorkflowNet parse_pnml(const std::string& bytes);

}  // namespace wnd
