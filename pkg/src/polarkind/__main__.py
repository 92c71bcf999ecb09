from polarkind.cli.main import main

main()
