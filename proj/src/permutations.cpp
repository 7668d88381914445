#include "asymfree/permutations.hpp"

namespace asymfree {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
        if (v < 0 || v >= static_cast<int>(images_.size()) || seen[static_cast<std::size_t>(v)])
            throw_invalid("Permutation: image list is not a bijection");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(int m) {
    std::vector<int> img(static_cast<std::size_t>(m));
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img), Unchecked{});
}

Permutation Permutation::compose(const Permutation& other) const {
    if (size() != other.size()) throw_invalid("Permutation::compose: size mismatch");
    std::vector<int> img(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
        img[i] = images_[static_cast<std::size_t>(other.images_[i])];
    return Permutation(std::move(img), Unchecked{});
}

Permutation Permutation::inverse() const {
    std::vector<int> img(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
        img[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
    return Permutation(std::move(img), Unchecked{});
}

int Permutation::cycle_count() const {
    int count = 0;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (seen[i]) continue;
        ++count;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<std::size_t>(images_[j]);
        }
    }
    return count;
}

std::vector<int> Permutation::cycle_type() const {
    std::vector<int> lengths;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<std::size_t>(images_[j]);
            ++len;
        }
        lengths.push_back(len);
    }
    std::sort(lengths.rbegin(), lengths.rend());
    return lengths;
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (images_[i] != static_cast<int>(i)) return false;
    return true;
}

void Permutation::for_each(int m, const std::function<void(const Permutation&)>& fn) {
    std::vector<int> img(static_cast<std::size_t>(m));
    std::iota(img.begin(), img.end(), 0);
    do {
        fn(Permutation(img, Unchecked{}));
    } while (std::next_permutation(img.begin(), img.end()));
}

}  // namespace asymfree
