#pragma once

// Shared worked examples.

#include <string>
#include <vector>

#include "bbs/core.hpp"
#include "bbs/slots.hpp"

namespace fixtures {

using bbs::Count;
using Rows = std::vector<std::vector<Count>>;

// Excursion with one 4-soliton, one 2-soliton and two 1-solitons.
inline const std::string kSample = "1110110010110000";
inline const Rows kSampleRows = {{0, 0, 1, 0, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0}, {1}};

// Diagram with x_3 = (2), x_2 = (0,0,1,0,0), x_1 = (3,0,4,1,0,0,0,0,2,0,1), built by insertions.
inline const Rows kWorkedRows = {{3, 0, 4, 1, 0, 0, 0, 0, 2, 0, 1}, {0, 0, 1, 0, 0}, {2}};

struct Insertion {
  int k;
  std::size_t slot;
  Count times;
  std::string result;
};

inline const std::vector<Insertion> kWorkedChain = {
    {3, 0, 2, "111000111000"},
    {2, 2, 1, "1110001100111000"},
    {1, 0, 3, "1010101110001100111000"},
    {1, 2, 4, "101010111010101010001100111000"},
    {1, 3, 1, "10101011101010101001001100111000"},
    {1, 8, 2, "101010111010101010010011001110101000"},
    {1, 10, 1, "10101011101010101001001100111010100010"},
};

inline const std::string kWorkedExcursion = kWorkedChain.back().result;

// The same string with the soliton inserted at 1-slot 3 moved one box to the left; its
// five middle 1-solitons then share one slot.
inline const std::string kShiftedWorked = "10101011101010101010001100111010100010";
inline const Rows kShiftedWorkedRows = {{3, 0, 5, 0, 0, 0, 0, 0, 2, 0, 1}, {0, 0, 1, 0, 0}, {2}};

// Six consecutive diagrams i = -3..2, empty at both ends, the one at 0 of maximal size 4.
inline bbs::DiagramSequence six_diagram_window() {
  return {-3,
          {bbs::SlotDiagram(),
           bbs::SlotDiagram(Rows{{0, 2, 0}, {1}}),
           bbs::SlotDiagram(Rows{{3}}),
           bbs::SlotDiagram(kSampleRows),
           bbs::SlotDiagram(Rows{{1, 0, 0, 2, 0, 0, 1}, {0, 1, 0}, {1}}),
           bbs::SlotDiagram()}};
}

// Four records and three excursions, the middle one empty; solitons of sizes 4, 3, 2 and 1.
inline bbs::ExcursionSequence three_block_window() {
  return {0,
          {bbs::Excursion::parse(kSample), bbs::Excursion(),
           bbs::excursion_from_diagram(bbs::SlotDiagram(Rows{{0, 1, 0, 0, 1}, {0, 0, 0}, {1}}))}};
}

}  // namespace fixtures
