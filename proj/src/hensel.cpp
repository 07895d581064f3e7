// placeholder, populated in later commits
