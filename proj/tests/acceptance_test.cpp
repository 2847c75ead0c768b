// Placeholder; the acceptance suite is filled in alongside the unit tests.
#include <iostream>

int main() {
    std::cout << "acceptance suite not yet implemented\n";
    return 1;
}
