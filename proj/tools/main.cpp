// absa: aspect-based sentiment analysis evaluation harness.
//
//   absa validate FILE...
//   absa stats FILE...
//   absa run --corpus FILE --ate replay --asc replay --fixtures FIX --out DIR
//   absa score --corpus FILE --predictions DUMP --out DIR
//   absa compare --report DIR/report.json --dataset Res-14
//   absa record --corpus FILE --ate remote --asc remote --fixtures FIX
//
// Options may also come from `absa --config FILE <command>`, where FILE holds
// key = value lines under a [run], [score], ... section.

#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return absa::cli::run(args, std::cout, std::cerr);
}
