// placeholder while the library modules land; replaced by the full CLI
#include <iostream>

int main() {
    std::cout << "modlie: not yet wired\n";
    return 2;
}
