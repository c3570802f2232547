#include "bsom/render.hpp"

#include <algorithm>
#include <sstream>

#include "bsom/error.hpp"

namespace bsom {
namespace {

const char* junction(bool up, bool down, bool left, bool right) {
  const int code = (up ? 8 : 0) | (down ? 4 : 0) | (left ? 2 : 0) | (right ? 1 : 0);
  static const char* const table[16] = {
      " ",  // none
      "─",  // right
      "─",  // left
      "─",  // left right
      "│",  // down
      "┌",  // down right
      "┐",  // down left
      "┬",  // down left right
      "│",  // up
      "└",  // up right
      "┘",  // up left
      "┴",  // up left right
      "│",  // up down
      "├",  // up down right
      "┤",  // up down left
      "┼",  // all
  };
  return table[code];
}

std::string rtrim(std::string s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

std::string render_map(const SomMap& map, const Partition* partition, const Dataset* labeled) {
  if (partition && (partition->rows != map.rows || partition->cols != map.cols))
    throw Error(ErrorCode::InvalidArgument, "partition shape differs from map shape");
  const bool with_labels = labeled && labeled->has_labels();

  std::vector<std::string> text(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    std::string cell;
    if (partition) cell += "B" + std::to_string(partition->block_of[i]) + " ";
    cell += "(";
    if (with_labels) {
      std::vector<std::size_t> counts(labeled->class_count(), 0);
      for (auto id : map.pes[i].member_ids) {
        if (id >= labeled->size()) throw Error(ErrorCode::InvalidArgument, "labels do not cover map members");
        ++counts[labeled->labels()[id]];
      }
      for (std::size_t c = 0; c < counts.size(); ++c)
        cell += (c ? "," : "") + std::to_string(counts[c]);
    } else {
      cell += std::to_string(map.pes[i].n());
    }
    cell += ")";
    text[i] = std::move(cell);
  }
  std::size_t width = 0;
  for (const auto& t : text) width = std::max(width, t.size());
  width += 2;

  auto differs = [&](std::size_t a, std::size_t b) {
    return partition && partition->block_of[a] != partition->block_of[b];
  };

  std::ostringstream out;
  if (with_labels) {
    out << "populations: (";
    for (std::size_t c = 0; c < labeled->class_count(); ++c)
      out << (c ? ", " : "") << labeled->class_names()[c];
    out << ")\n";
  }
  if (partition) out << "blocks: " << partition->block_count << "\n";

  for (int r = 0; r < map.rows; ++r) {
    std::string line;
    for (int c = 0; c < map.cols; ++c) {
      const auto& t = text[map.index(r, c)];
      line += " " + t + std::string(width - 1 - t.size(), ' ');
      if (c + 1 < map.cols) line += differs(map.index(r, c), map.index(r, c + 1)) ? "│" : " ";
    }
    out << rtrim(line) << '\n';
    if (!partition || r + 1 == map.rows) continue;

    std::string sep;
    for (int c = 0; c < map.cols; ++c) {
      const bool left = differs(map.index(r, c), map.index(r + 1, c));
      if (left) {
        for (std::size_t k = 0; k < width; ++k) sep += "─";
      } else {
        sep += std::string(width, ' ');
      }
      if (c + 1 < map.cols) {
        const bool up = differs(map.index(r, c), map.index(r, c + 1));
        const bool down = differs(map.index(r + 1, c), map.index(r + 1, c + 1));
        const bool right = differs(map.index(r, c + 1), map.index(r + 1, c + 1));
        sep += junction(up, down, left, right);
      }
    }
    out << rtrim(sep) << '\n';
  }
  return out.str();
}

}  // namespace bsom
