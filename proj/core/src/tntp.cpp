#include "ngev/tntp.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "ngev/errors.hpp"

namespace ngev {

namespace {

struct LineScanner {
  std::string_view text;
  std::size_t pos = 0;
  int line_no = 0;

  bool next(std::string_view& out) {
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      // strip CR and surrounding blanks
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
        line.remove_suffix(1);
      }
      while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
        line.remove_prefix(1);
      }
      if (line.empty() || line.front() == '~') continue;
      out = line;
      return true;
    }
    return false;
  }
};

[[noreturn]] void parse_fail(const char* what, int line_no) {
  fail(ErrorCategory::parse,
       std::string(what) + " at line " + std::to_string(line_no));
}

bool is_metadata(std::string_view line) { return !line.empty() && line.front() == '<'; }

std::string_view metadata_key(std::string_view line) {
  const auto close = line.find('>');
  return close == std::string_view::npos ? line : line.substr(1, close - 1);
}

std::string_view metadata_value(std::string_view line) {
  const auto close = line.find('>');
  if (close == std::string_view::npos || close + 1 >= line.size()) return {};
  auto v = line.substr(close + 1);
  while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
  return v;
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ';')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ';') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double to_double(std::string_view tok, int line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_fail("malformed number", line_no);
  }
  return value;
}

long to_long(std::string_view tok, int line_no) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_fail("malformed integer", line_no);
  }
  return value;
}

std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

TntpInstance parse_tntp(std::string_view net_text, std::string_view trips_text) {
  long declared_nodes = -1;
  long declared_links = -1;

  LineScanner net{net_text};
  std::string_view line;
  bool in_metadata = true;
  std::vector<Link> links;
  std::vector<double> cost, cap;

  while (net.next(line)) {
    if (in_metadata && is_metadata(line)) {
      const auto key = metadata_key(line);
      if (key == "NUMBER OF NODES") declared_nodes = to_long(metadata_value(line), net.line_no);
      if (key == "NUMBER OF LINKS") declared_links = to_long(metadata_value(line), net.line_no);
      if (key == "END OF METADATA") in_metadata = false;
      continue;
    }
    in_metadata = false;
    const auto tok = tokenize(line);
    if (tok.size() < 10) parse_fail("link row needs 10 columns", net.line_no);
    const long tail = to_long(tok[0], net.line_no);
    const long head = to_long(tok[1], net.line_no);
    double capacity = to_double(tok[2], net.line_no);
    const double free_flow_time = to_double(tok[4], net.line_no);
    const double bpr_b = to_double(tok[5], net.line_no);
    if (bpr_b < 0.0) {
      fail(ErrorCategory::validation,
           "negative volume-delay coefficient at line " + std::to_string(net.line_no));
    }
    // The volume-delay function here is the pure quartic cbar (1 + (X/k)^4),
    // so a file coefficient b folds into the nominal capacity k b^(-1/4):
    // cbar (1 + b (X/k)^4) = cbar (1 + (X / (k b^(-1/4)))^4).
    if (bpr_b > 0.0 && bpr_b != 1.0) capacity *= std::pow(bpr_b, -0.25);
    if (declared_nodes >= 0 && (tail < 1 || tail > declared_nodes || head < 1 || head > declared_nodes)) {
      fail(ErrorCategory::structural,
           "link references unknown node at line " + std::to_string(net.line_no));
    }
    if (tail < 1 || head < 1) {
      fail(ErrorCategory::structural,
           "node ids must be 1-based at line " + std::to_string(net.line_no));
    }
    if (capacity < 0.0 || free_flow_time < 0.0) {
      fail(ErrorCategory::validation,
           "negative capacity or cost at line " + std::to_string(net.line_no));
    }
    links.push_back(Link{static_cast<NodeId>(tail - 1), static_cast<NodeId>(head - 1)});
    cost.push_back(free_flow_time);
    cap.push_back(capacity);
  }

  NodeId node_count = static_cast<NodeId>(declared_nodes >= 0 ? declared_nodes : 0);
  for (const Link& l : links) {
    node_count = std::max(node_count, static_cast<NodeId>(std::max(l.tail, l.head) + 1));
  }
  if (declared_links >= 0 && declared_links != static_cast<long>(links.size())) {
    fail(ErrorCategory::parse,
         "declared " + std::to_string(declared_links) + " links, found " +
             std::to_string(links.size()));
  }

  TntpInstance out;
  out.network = Network(Graph(node_count, std::move(links)), std::move(cost), std::move(cap));
  out.demand = DemandTable(node_count);

  LineScanner trips{trips_text};
  in_metadata = true;
  long origin = -1;
  while (trips.next(line)) {
    if (in_metadata && is_metadata(line)) {
      if (metadata_key(line) == "END OF METADATA") in_metadata = false;
      continue;
    }
    in_metadata = false;
    if (line.starts_with("Origin")) {
      const auto tok = tokenize(line.substr(6));
      if (tok.size() != 1) parse_fail("malformed Origin header", trips.line_no);
      origin = to_long(tok[0], trips.line_no);
      if (origin < 1 || origin > node_count) {
        fail(ErrorCategory::structural,
             "trip origin references unknown node at line " + std::to_string(trips.line_no));
      }
      continue;
    }
    if (origin < 0) parse_fail("trip entry before any Origin header", trips.line_no);
    // entries look like "d : flow;" repeated on one line
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      const auto colon = line.find(':', i);
      if (colon == std::string_view::npos) parse_fail("missing ':' in trip entry", trips.line_no);
      const auto semi = line.find(';', colon);
      if (semi == std::string_view::npos) parse_fail("missing ';' in trip entry", trips.line_no);
      auto dest_tok = tokenize(line.substr(i, colon - i));
      auto flow_tok = tokenize(line.substr(colon + 1, semi - colon - 1));
      if (dest_tok.size() != 1 || flow_tok.size() != 1) {
        parse_fail("malformed trip entry", trips.line_no);
      }
      const long dest = to_long(dest_tok[0], trips.line_no);
      const double flow = to_double(flow_tok[0], trips.line_no);
      if (dest < 1 || dest > node_count) {
        fail(ErrorCategory::structural,
             "trip destination references unknown node at line " + std::to_string(trips.line_no));
      }
      if (flow < 0.0) {
        fail(ErrorCategory::validation,
             "negative trip flow at line " + std::to_string(trips.line_no));
      }
      out.demand.add(static_cast<NodeId>(origin - 1), static_cast<NodeId>(dest - 1), flow);
      i = semi + 1;
    }
  }
  return out;
}

std::string serialize_tntp_net(const Network& network) {
  std::ostringstream os;
  os << "<NUMBER OF ZONES> " << network.node_count() << "\n";
  os << "<NUMBER OF NODES> " << network.node_count() << "\n";
  os << "<FIRST THRU NODE> 1\n";
  os << "<NUMBER OF LINKS> " << network.link_count() << "\n";
  os << "<END OF METADATA>\n\n";
  os << "~ init_node term_node capacity length free_flow_time b power speed toll type ;\n";
  // Capacities are already nominal, so the coefficient column is written as 1.
  for (LinkId l = 0; l < network.link_count(); ++l) {
    const Link& e = network.graph.link(l);
    const std::string cost = format_full(network.free_flow_cost[static_cast<std::size_t>(l)]);
    os << network.external_id(e.tail) << "\t" << network.external_id(e.head) << "\t"
       << format_full(network.capacity[static_cast<std::size_t>(l)]) << "\t" << cost << "\t"
       << cost << "\t1\t4\t0\t0\t1\t;\n";
  }
  return os.str();
}

std::string serialize_tntp_trips(const Network& network, const DemandTable& demand) {
  std::ostringstream os;
  os << "<NUMBER OF ZONES> " << network.node_count() << "\n";
  os << "<TOTAL OD FLOW> " << format_full(demand.total_flow()) << "\n";
  os << "<END OF METADATA>\n\n";
  // Blocks are emitted per origin in ascending id to keep output canonical.
  const auto dests = demand.destinations();
  for (NodeId o = 0; o < network.node_count(); ++o) {
    std::ostringstream block;
    int entries = 0;
    for (NodeId d : dests) {
      const double f = demand.demand(d)[static_cast<std::size_t>(o)];
      if (f <= 0.0) continue;
      block << "  " << network.external_id(d) << " : " << format_full(f) << ";";
      if (++entries % 5 == 0) block << "\n";
    }
    if (entries == 0) continue;
    os << "Origin " << network.external_id(o) << "\n" << block.str();
    if (entries % 5 != 0) os << "\n";
    os << "\n";
  }
  return os.str();
}

TntpInstance load_tntp_files(const std::string& net_path, const std::string& trips_path) {
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCategory::io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string net = slurp(net_path);
  const std::string trips = slurp(trips_path);
  return parse_tntp(net, trips);
}

}  // namespace ngev
