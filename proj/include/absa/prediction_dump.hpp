#ifndef ABSA_PREDICTION_DUMP_HPP_
#define ABSA_PREDICTION_DUMP_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absa/normalize.hpp"
#include "absa/pipeline.hpp"

namespace absa {

// One JSON object per line:
//   {"id":..., "aspects":[{"term":..., "polarity":..., "span":[from,to]?,
//                          "scores":{"positive":p,"negative":n,"neutral":u}?}]}
// Timing and backend ids are not part of the dump.
std::string write_prediction_dump(std::span<const PipelineOutput> outputs);

// Throws DumpCorrupt naming the offending line. `norm` fills
// PredictedAspect::normalized.
std::vector<PipelineOutput> read_prediction_dump(std::string_view bytes,
                                                 const NormConfig& norm = {});

}  // namespace absa

#endif  // ABSA_PREDICTION_DUMP_HPP_
