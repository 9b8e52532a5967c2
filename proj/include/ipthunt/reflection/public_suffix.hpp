#pragma once

#include <string>
#include <string_view>

namespace ipthunt {

// Registrable domain (public suffix + one label) from an embedded snapshot of
// multi-label public suffixes; single-label suffixes follow the default "*"
// rule. IP literals and single-label hosts are returned unchanged.
std::string apex_domain(std::string_view host);

// Longest matching public suffix of `host`.
std::string public_suffix(std::string_view host);

}  // namespace ipthunt
