# empty, just to make utils a package
