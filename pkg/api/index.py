"""
Entry point for Vercel Serverless Functions
Vercel looks for files in the /api/ directory for serverless functions
"""
import os
import sys
from pathlib import Path

# Add root directory to path to import app
root_dir = Path(__file__).parent.parent
sys.path.insert(0, str(root_dir))

# matplotlib needs a writable config dir on the read-only serverless filesystem
os.environ.setdefault("MPLCONFIGDIR", "/tmp/matplotlib")

try:
    # Import FastAPI app
    from app.main import app
    print("✓ Gabor frame service imported successfully")
except Exception as e:
    print(f"❌ Error importing app: {e}")
    import traceback
    traceback.print_exc()
    raise

# Vercel automatically detects FastAPI and uses the app object directly
