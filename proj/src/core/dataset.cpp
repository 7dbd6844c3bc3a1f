#include "dataset.hpp"

#include <algorithm>
#include <cstdio>

#include "error.hpp"
#include "instances.hpp"
#include "rdm.hpp"
#include "tensor_io.hpp"

namespace bseg {

namespace fs = std::filesystem;

fs::path DatasetLayout::image_path(const std::string& stem) const {
  return image_dir() / (stem + ".png");
}
fs::path DatasetLayout::label_path(const std::string& stem) const {
  return label_dir() / (stem + kLabelExtension);
}
fs::path DatasetLayout::rdm_path(const std::string& stem) const {
  return rdm_dir() / (stem + kTensorExtension);
}

std::string item_stem(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", index);
  return buf;
}

std::vector<std::string> list_stems(const fs::path& dir, const std::string& extension) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() > extension.size() &&
        name.compare(name.size() - extension.size(), extension.size(), extension) == 0) {
      stems.push_back(name.substr(0, name.size() - extension.size()));
    }
  }
  std::sort(stems.begin(), stems.end());
  return stems;
}

fs::path resolve_label_dir(const fs::path& dir) {
  if (fs::is_directory(dir / "labels")) return dir / "labels";
  if (fs::is_directory(dir / "pred")) return dir / "pred";
  return dir;
}

fs::path resolve_image_dir(const fs::path& dir) {
  if (fs::is_directory(dir / "images")) return dir / "images";
  return dir;
}

std::vector<DatasetItem> load_dataset(const fs::path& root) {
  const DatasetLayout layout(root);
  const auto stems = list_stems(layout.label_dir(), kLabelExtension);
  if (stems.empty()) throw IoError("dataset has no label maps: " + layout.label_dir().string());
  std::vector<DatasetItem> items;
  items.reserve(stems.size());
  for (const std::string& stem : stems) {
    DatasetItem item;
    item.stem = stem;
    const Rgb8Image rgb = read_rgb_png(layout.image_path(stem));
    item.image = encode_rgb8(rgb.pixels, rgb.height, rgb.width);
    item.labels = read_label_png(layout.label_path(stem));
    if (item.labels.height != rgb.height || item.labels.width != rgb.width) {
      throw ShapeError(stem + ": image and label map differ in size");
    }
    const fs::path rdm_file = layout.rdm_path(stem);
    if (!fs::exists(rdm_file)) {
      throw IoError("missing cached RDM " + rdm_file.string() + " (run the rdm command first)");
    }
    const ImageTensor rdm = read_image_tensor(rdm_file);
    item.target = make_target_pair(foreground_of(item.labels), rdm);
    items.push_back(std::move(item));
  }
  return items;
}

int compute_dataset_rdms(const fs::path& root) {
  const DatasetLayout layout(root);
  const auto stems = list_stems(layout.label_dir(), kLabelExtension);
  for (const std::string& stem : stems) {
    write_image_tensor(layout.rdm_path(stem),
                       reverse_distance_map(read_label_png(layout.label_path(stem))));
  }
  return static_cast<int>(stems.size());
}

}  // namespace bseg
