from wlhier.cli import main

main()
