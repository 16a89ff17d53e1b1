#pragma once

#include <string>
#include <string_view>

#include "ngev/network.hpp"

namespace ngev {

struct TntpInstance {
  Network network;
  DemandTable demand;
};

/// Parses a network/trips pair following the plain-text TNTP convention:
/// angle-bracket metadata lines up to <END OF METADATA>, `~` comment lines,
/// then link rows `init term capacity length free_flow_time b power speed
/// toll type ;` and trips organized as `Origin o` blocks of `d : flow;`
/// entries. The free_flow_time column becomes the link cost. The capacity
/// column and the volume-delay coefficient b together give the nominal
/// capacity kappa = capacity * b^(-1/4) of the pure quartic cost function
/// (the flow at which the link cost doubles); power/speed/toll/type are
/// read and discarded. Node ids are rebased to dense 0-based ids; the
/// original 1-based ids are kept on the Network for output.
TntpInstance parse_tntp(std::string_view net_text, std::string_view trips_text);

std::string serialize_tntp_net(const Network& network);
std::string serialize_tntp_trips(const Network& network, const DemandTable& demand);

TntpInstance load_tntp_files(const std::string& net_path, const std::string& trips_path);

}  // namespace ngev
