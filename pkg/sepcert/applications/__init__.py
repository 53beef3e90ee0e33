# empty, just to make applications a package
