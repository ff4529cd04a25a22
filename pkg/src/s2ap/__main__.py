from s2ap.cli import main

main()
