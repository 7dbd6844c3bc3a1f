#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "image_io.hpp"
#include "packing.hpp"
#include "tensor.hpp"

namespace bseg {

/// On-disk dataset: images/<stem>.png, labels/<stem>.png16, rdm/<stem>.bsgt.
class DatasetLayout {
 public:
  explicit DatasetLayout(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path image_dir() const { return root_ / "images"; }
  std::filesystem::path label_dir() const { return root_ / "labels"; }
  std::filesystem::path rdm_dir() const { return root_ / "rdm"; }
  std::filesystem::path image_path(const std::string& stem) const;
  std::filesystem::path label_path(const std::string& stem) const;
  std::filesystem::path rdm_path(const std::string& stem) const;

 private:
  std::filesystem::path root_;
};

inline constexpr const char* kLabelExtension = ".png16";
inline constexpr const char* kTensorExtension = ".bsgt";

std::string item_stem(int index);

/// Sorted stems of files in `dir` whose name ends with `extension`.
std::vector<std::string> list_stems(const std::filesystem::path& dir,
                                    const std::string& extension);

/// Resolves a directory holding label maps: <dir>/labels, <dir>/pred, or dir.
std::filesystem::path resolve_label_dir(const std::filesystem::path& dir);

/// Resolves a directory holding input images: <dir>/images or dir.
std::filesystem::path resolve_image_dir(const std::filesystem::path& dir);

struct DatasetItem {
  std::string stem;
  EncodedImage image;
  InstanceLabelMap labels;
  TargetPair target;
};

/// Loads every labelled item; cached RDMs are required (see the rdm command).
std::vector<DatasetItem> load_dataset(const std::filesystem::path& root);

/// Recomputes rdm/<stem>.bsgt for every label map; returns the count.
int compute_dataset_rdms(const std::filesystem::path& root);

}  // namespace bseg
