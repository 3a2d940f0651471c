#include <cstdio>

#include "absa/report.hpp"
#include "absa/sha256.hpp"

namespace absa {
namespace {

constexpr const char* kPipelinedTable =
    "published table: selected models individually and pipelined";
constexpr const char* kLiteratureTable =
    "published table: literature summary of ATE/ASC models";
constexpr const char* kJointTable = "published table: joint-task models";
constexpr const char* kJointText = "published results text: joint pair extraction F1";
constexpr const char* kStudyTable = "published table: models evaluated on SemEval 2014";

std::vector<Baseline> shipped_entries() {
  std::vector<Baseline> v;
  auto add = [&](const char* model, const char* dataset, std::string_view task,
                 double f1, const char* provenance) {
    v.push_back({model, dataset, std::string(task), f1, provenance});
  };

  add("Instruct-DeBERTa", "Res-14", task::kAte, 91.39, kPipelinedTable);
  add("Instruct-DeBERTa", "Res-14", task::kAsc, 88.63, kPipelinedTable);
  add("Instruct-DeBERTa", "Lap-14", task::kAte, 91.56, kPipelinedTable);
  add("Instruct-DeBERTa", "Lap-14", task::kAsc, 89.65, kPipelinedTable);
  add("Instruct-DeBERTa", "Res-15", task::kAte, 75.13, kPipelinedTable);
  add("Instruct-DeBERTa", "Res-15", task::kAsc, 81.26, kPipelinedTable);
  add("Instruct-DeBERTa", "Res-16", task::kAte, 77.79, kPipelinedTable);
  add("Instruct-DeBERTa", "Res-16", task::kAsc, 79.35, kPipelinedTable);
  add("Instruct-DeBERTa", "Res-14", task::kJoint, 80.78, kJointText);
  add("Instruct-DeBERTa", "Lap-14", task::kJoint, 80.94, kJointText);

  add("InstructABSA", "Res-14", task::kAte, 92.10, kPipelinedTable);
  add("InstructABSA", "Lap-14", task::kAte, 92.30, kPipelinedTable);
  add("InstructABSA", "Res-15", task::kAte, 76.64, kPipelinedTable);
  add("InstructABSA", "Res-16", task::kAte, 80.32, kPipelinedTable);

  add("DeBERTa-V3-base-absa-v1.1", "Res-14", task::kAscGivenGold, 90.94, kPipelinedTable);
  add("DeBERTa-V3-base-absa-v1.1", "Lap-14", task::kAscGivenGold, 90.32, kPipelinedTable);
  add("DeBERTa-V3-base-absa-v1.1", "Res-15", task::kAscGivenGold, 89.55, kPipelinedTable);
  add("DeBERTa-V3-base-absa-v1.1", "Res-16", task::kAscGivenGold, 83.71, kPipelinedTable);

  add("DeBERTa-V3-base-absa-v1", "Res-14", task::kAscGivenGold, 90.94, kLiteratureTable);
  add("DeBERTa-V3-base-absa-v1", "Lap-14", task::kAscGivenGold, 90.32, kLiteratureTable);
  add("DeBERTa-V3-base-absa-v1", "Res-15", task::kAscGivenGold, 89.55, kLiteratureTable);
  add("DeBERTa-V3-base-absa-v1", "Res-16", task::kAscGivenGold, 84.91, kLiteratureTable);

  add("InstructABSA", "Lap-14", task::kJoint, 79.34, kJointTable);
  add("InstructABSA", "Res-14", task::kJoint, 79.47, kJointTable);
  add("GRACE", "Lap-14", task::kJoint, 70.71, kJointTable);
  add("GRACE", "Res-14", task::kJoint, 77.26, kJointTable);
  add("SPAN", "Lap-14", task::kJoint, 68.06, kJointTable);
  add("SPAN", "Res-14", task::kJoint, 74.92, kJointTable);
  add("RACL-BERT", "Lap-14", task::kJoint, 63.40, kJointTable);
  add("RACL-BERT", "Res-14", task::kJoint, 75.42, kJointTable);
  add("BERT-E2E-ABSA", "Lap-14", task::kJoint, 61.12, kJointTable);
  add("BERT-E2E-ABSA", "Res-14", task::kJoint, 74.72, kJointTable);
  add("DOER", "Lap-14", task::kJoint, 60.35, kJointTable);
  add("DOER", "Res-14", task::kJoint, 72.78, kJointTable);
  add("IMN", "Lap-14", task::kJoint, 58.37, kJointTable);
  add("IMN", "Res-14", task::kJoint, 69.54, kJointTable);
  add("E2E-TBSA", "Lap-14", task::kJoint, 57.90, kJointTable);
  add("E2E-TBSA", "Res-14", task::kJoint, 69.80, kJointTable);

  add("Llama-2-7b QLoRA", "Res-14", task::kAte, 71.94, kStudyTable);
  add("Llama-2-7b QLoRA", "Res-14", task::kAsc, 69.29, kStudyTable);
  add("Llama-2-7b QLoRA", "Lap-14", task::kAte, 71.66, kStudyTable);
  add("Llama-2-7b QLoRA", "Lap-14", task::kAsc, 66.53, kStudyTable);
  add("Mistral-7b QLoRA", "Res-14", task::kAte, 81.33, kStudyTable);
  add("Mistral-7b QLoRA", "Res-14", task::kAsc, 76.46, kStudyTable);
  add("Mistral-7b QLoRA", "Lap-14", task::kAte, 77.65, kStudyTable);
  add("Mistral-7b QLoRA", "Lap-14", task::kAsc, 72.40, kStudyTable);
  add("ASGCN+GloVe+UIKA", "Res-14", task::kAsc, 76.93, kStudyTable);
  add("ASGCN+GloVe+UIKA", "Lap-14", task::kAsc, 75.21, kStudyTable);
  add("SSGCN+GloVe", "Res-14", task::kAsc, 76.43, kStudyTable);
  add("SSGCN+GloVe", "Lap-14", task::kAsc, 76.17, kStudyTable);
  add("SPAN-ASTE", "Res-14", task::kAte, 67.54, kStudyTable);
  add("SPAN-ASTE", "Lap-14", task::kAte, 61.12, kStudyTable);
  return v;
}

}  // namespace

const PublishedBaselines& PublishedBaselines::shipped() {
  static const PublishedBaselines baselines(shipped_entries());
  return baselines;
}

std::optional<double> PublishedBaselines::find(std::string_view model,
                                           std::string_view dataset,
                                           std::string_view task) const {
  for (const Baseline& b : entries_) {
    if (b.model == model && b.dataset == dataset && b.task == task) return b.f1;
  }
  return std::nullopt;
}

bool PublishedBaselines::has_dataset(std::string_view dataset) const {
  for (const Baseline& b : entries_) {
    if (b.dataset == dataset) return true;
  }
  return false;
}

std::string PublishedBaselines::checksum() const {
  std::string canonical;
  char value[32];
  for (const Baseline& b : entries_) {
    std::snprintf(value, sizeof(value), "%.2f", b.f1);
    canonical += b.model + "|" + b.dataset + "|" + b.task + "|" + value + "|" +
                 b.provenance + "\n";
  }
  return sha256_hex(canonical);
}

}  // namespace absa
