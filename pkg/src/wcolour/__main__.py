"""
Allow running wcolour as a module: python -m wcolour
"""
from wcolour import main

if __name__ == "__main__":
    main()
