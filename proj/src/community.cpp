#include "agmgan/community.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "agmgan/errors.hpp"

namespace agmgan {

CommunityAssignment read_communities(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open community file: " + path.string());

  CommunityAssignment a;
  std::string line;
  std::int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    std::istringstream tokens(line);
    std::vector<std::int64_t> members;
    std::int64_t id;
    while (tokens >> id) members.push_back(id);
    if (!tokens.eof()) {
      throw InputError(path.string() + ":" + std::to_string(line_number) +
                       ": expected integer vertex ids");
    }
    if (!members.empty()) a.communities.push_back(std::move(members));
  }
  if (a.communities.empty())
    throw InputError("community file holds no communities: " + path.string());
  return a;
}

void write_communities(const std::filesystem::path& path, const CommunityAssignment& a) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write community file: " + path.string());
  for (const auto& community : a.communities) {
    for (std::size_t i = 0; i < community.size(); ++i) {
      if (i > 0) out << ' ';
      out << community[i];
    }
    out << '\n';
  }
}

CommunityAssignment to_compact(const CommunityAssignment& a, const Graph& g) {
  std::unordered_map<std::int64_t, int> compact;
  compact.reserve(g.original_ids().size());
  for (int v = 0; v < g.vertex_count(); ++v) compact.emplace(g.original_id(v), v);

  CommunityAssignment out;
  out.dropped_empty = a.dropped_empty;
  out.communities.reserve(a.communities.size());
  for (const auto& community : a.communities) {
    std::vector<std::int64_t> members;
    members.reserve(community.size());
    for (std::int64_t id : community) {
      auto it = compact.find(id);
      if (it == compact.end())
        throw InputError("community member " + std::to_string(id) + " is not a graph vertex");
      members.push_back(it->second);
    }
    out.communities.push_back(std::move(members));
  }
  return out;
}

CommunityAssignment to_original(const CommunityAssignment& a, const Graph& g) {
  CommunityAssignment out;
  out.dropped_empty = a.dropped_empty;
  out.communities.reserve(a.communities.size());
  for (const auto& community : a.communities) {
    std::vector<std::int64_t> members;
    members.reserve(community.size());
    for (std::int64_t v : community) {
      if (v < 0 || v >= g.vertex_count())
        throw InputError("compact id " + std::to_string(v) + " out of range");
      members.push_back(g.original_id(static_cast<int>(v)));
    }
    out.communities.push_back(std::move(members));
  }
  return out;
}

}  // namespace agmgan
